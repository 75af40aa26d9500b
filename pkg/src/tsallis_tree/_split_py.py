"""Pure-Python split search and tree growth.

Used when the compiled ``_split`` extension is unavailable. Follows the
Cython kernel step for step so both produce bit-identical trees; transcendental
functions go through :mod:`math` (libm) rather than numpy ufuncs, whose SIMD
variants round differently.
"""

import math

import numpy as np

MIN_GAIN = 1e-12


def _entropy(counts, total, q):
    s = 0.0
    if q == 1.0:
        for c in counts:
            if c > 0:
                p = c / total
                s += p * math.log(p)
        return -s
    for c in counts:
        if c > 0:
            p = c / total
            s += p**q
    return (s - 1.0) / (1.0 - q)


def _gain(parent_imp, left, right, n_left, n, q, ratio):
    n_right = n - n_left
    w_left = n_left / n
    w_right = n_right / n
    g = parent_imp - w_left * _entropy(left, n_left, q) - w_right * _entropy(right, n_right, q)
    if ratio:
        g = g / _entropy((n_left, n_right), n, q)
    return g


def _find_split(cols, is_num, y, order, start, end, k, q, ratio, min_leaf, parent):
    n = end - start
    parent_imp = _entropy(parent, n, q)
    best_attr, best_value, best_gain = -1, 0.0, -math.inf
    for j, col in enumerate(cols):
        seg = order[j][start:end]
        if is_num[j]:
            left = [0] * k
            for i in range(n - 1):
                s = seg[i]
                left[y[s]] += 1
                n_left = i + 1
                if n - n_left < min_leaf:
                    break
                if n_left < min_leaf:
                    continue
                v = col[s]
                v_next = col[seg[i + 1]]
                if not v < v_next:
                    continue
                right = [p - l for p, l in zip(parent, left)]
                gain = _gain(parent_imp, left, right, n_left, n, q, ratio)
                if gain > best_gain:
                    value = (v + v_next) / 2.0
                    if not value < v_next:
                        value = v
                    best_attr, best_value, best_gain = j, value, gain
        else:
            i = 0
            while i < n:
                v = col[seg[i]]
                left = [0] * k
                g_end = i
                while g_end < n and col[seg[g_end]] == v:
                    left[y[seg[g_end]]] += 1
                    g_end += 1
                n_left = g_end - i
                i = g_end
                if n_left == n:
                    break
                if n_left < min_leaf or n - n_left < min_leaf:
                    continue
                right = [p - l for p, l in zip(parent, left)]
                gain = _gain(parent_imp, left, right, n_left, n, q, ratio)
                if gain > best_gain:
                    best_attr, best_value, best_gain = j, v, gain
    return best_attr, best_value, best_gain


def _prepare(X, y, samples):
    X = np.asarray(X, dtype=np.float64)
    samples = np.asarray(samples, dtype=np.intp)
    Xs = X[samples]
    order = [samples[np.argsort(Xs[:, j], kind="stable")].tolist() for j in range(X.shape[1])]
    cols = [X[:, j].tolist() for j in range(X.shape[1])]
    return cols, np.asarray(y).tolist(), order


def best_split(X, is_numeric, y, n_classes, samples, q, ratio, min_leaf):
    cols, ys, order = _prepare(X, y, samples)
    parent = [0] * n_classes
    for s in (order[0] if order else []):
        parent[ys[s]] += 1
    attr, value, gain = _find_split(
        cols, list(map(bool, is_numeric)), ys, order, 0, len(samples), n_classes,
        float(q), ratio, min_leaf, parent,
    )
    if gain <= MIN_GAIN:
        attr = -1
    return attr, value, gain


def build(X, is_numeric, y, n_classes, samples, q, ratio, min_leaf, max_depth):
    cols, ys, order = _prepare(X, y, samples)
    is_num = list(map(bool, is_numeric))
    q = float(q)
    k = n_classes
    attrs, values, lefts, rights, counts = [], [], [], [], []
    stack = [(0, len(samples), 0, -1, False)]
    while stack:
        start, end, depth, parent_node, is_left = stack.pop()
        node = len(attrs)
        if parent_node >= 0:
            if is_left:
                lefts[parent_node] = node
            else:
                rights[parent_node] = node
        parent = [0] * k
        for s in order[0][start:end]:
            parent[ys[s]] += 1
        attr = -1
        value = 0.0
        n_pure = sum(1 for c in parent if c > 0)
        if n_pure > 1 and end - start > min_leaf and (max_depth < 0 or depth < max_depth):
            attr, value, gain = _find_split(
                cols, is_num, ys, order, start, end, k, q, ratio, min_leaf, parent
            )
            if gain <= MIN_GAIN:
                attr = -1
        counts.append(parent)
        lefts.append(-1)
        rights.append(-1)
        if attr < 0:
            attrs.append(-1)
            values.append(0.0)
            continue
        attrs.append(attr)
        values.append(value)
        col = cols[attr]
        if is_num[attr]:
            goes_left = {s: col[s] <= value for s in order[attr][start:end]}
        else:
            goes_left = {s: col[s] == value for s in order[attr][start:end]}
        n_left = sum(goes_left.values())
        for j in range(len(cols)):
            seg = order[j][start:end]
            order[j][start:end] = [s for s in seg if goes_left[s]] + [s for s in seg if not goes_left[s]]
        stack.append((start + n_left, end, depth + 1, node, False))
        stack.append((start, start + n_left, depth + 1, node, True))
    return (
        np.array(attrs, dtype=np.intp),
        np.array(values, dtype=np.float64),
        np.array(lefts, dtype=np.intp),
        np.array(rights, dtype=np.intp),
        np.array(counts, dtype=np.int64).reshape(len(attrs), k),
    )
