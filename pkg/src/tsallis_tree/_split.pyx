# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled split search and tree growth.

Mirrors ``_split_py`` operation for operation; the two must produce
bit-identical trees.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, pow, INFINITY
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memset, memcpy

cnp.import_array()

ctypedef cnp.npy_intp intp
ctypedef long long count_t

cdef double MIN_GAIN = 1e-12


cdef inline double _entropy(const count_t* counts, Py_ssize_t k, count_t total, double q) noexcept nogil:
    cdef double s = 0.0
    cdef double p
    cdef Py_ssize_t i
    if q == 1.0:
        for i in range(k):
            if counts[i] > 0:
                p = <double>counts[i] / <double>total
                s += p * log(p)
        return -s
    for i in range(k):
        if counts[i] > 0:
            p = <double>counts[i] / <double>total
            s += pow(p, q)
    return (s - 1.0) / (1.0 - q)


cdef inline double _gain(double parent_imp, const count_t* left, const count_t* right,
                         Py_ssize_t k, count_t n_left, count_t n, double q, int ratio) noexcept nogil:
    cdef count_t n_right = n - n_left
    cdef double w_left = <double>n_left / <double>n
    cdef double w_right = <double>n_right / <double>n
    cdef double g = (parent_imp
                     - w_left * _entropy(left, k, n_left, q)
                     - w_right * _entropy(right, k, n_right, q))
    cdef count_t sizes[2]
    if ratio:
        sizes[0] = n_left
        sizes[1] = n_right
        g = g / _entropy(sizes, 2, n, q)
    return g


cdef void _find_split(const double[:, ::1] X, const unsigned char[::1] is_num, const intp[::1] y,
                      intp[:, ::1] order, Py_ssize_t start, Py_ssize_t end, Py_ssize_t k,
                      double q, int ratio, Py_ssize_t min_leaf, const count_t* parent,
                      count_t* left, count_t* right,
                      Py_ssize_t* best_attr, double* best_value, double* best_gain) noexcept nogil:
    cdef Py_ssize_t d = X.shape[1]
    cdef count_t n = end - start
    cdef double parent_imp = _entropy(parent, k, n, q)
    cdef Py_ssize_t j, i, c, g_end
    cdef count_t n_left
    cdef intp s, s_next
    cdef double v, v_next, value, gain

    best_attr[0] = -1
    best_value[0] = 0.0
    best_gain[0] = -INFINITY
    for j in range(d):
        if is_num[j]:
            memset(left, 0, k * sizeof(count_t))
            for i in range(start, end - 1):
                s = order[j, i]
                left[y[s]] += 1
                n_left = i - start + 1
                if n - n_left < min_leaf:
                    break
                if n_left < min_leaf:
                    continue
                v = X[s, j]
                v_next = X[order[j, i + 1], j]
                if not v < v_next:
                    continue
                for c in range(k):
                    right[c] = parent[c] - left[c]
                gain = _gain(parent_imp, left, right, k, n_left, n, q, ratio)
                if gain > best_gain[0]:
                    value = (v + v_next) / 2.0
                    if not value < v_next:
                        value = v
                    best_attr[0] = j
                    best_value[0] = value
                    best_gain[0] = gain
        else:
            i = start
            while i < end:
                v = X[order[j, i], j]
                memset(left, 0, k * sizeof(count_t))
                g_end = i
                while g_end < end and X[order[j, g_end], j] == v:
                    left[y[order[j, g_end]]] += 1
                    g_end += 1
                n_left = g_end - i
                i = g_end
                if n_left == n:
                    break
                if n_left < min_leaf or n - n_left < min_leaf:
                    continue
                for c in range(k):
                    right[c] = parent[c] - left[c]
                gain = _gain(parent_imp, left, right, k, n_left, n, q, ratio)
                if gain > best_gain[0]:
                    best_attr[0] = j
                    best_value[0] = v
                    best_gain[0] = gain


def _presort(const double[:, ::1] X, samples):
    samples = np.ascontiguousarray(samples, dtype=np.intp)
    Xs = np.asarray(X)[samples]
    order = np.empty((X.shape[1], samples.shape[0]), dtype=np.intp)
    for j in range(X.shape[1]):
        order[j] = samples[np.argsort(Xs[:, j], kind="stable")]
    return order


def best_split(const double[:, ::1] X, const unsigned char[::1] is_numeric, const intp[::1] y,
               Py_ssize_t n_classes, samples, double q, int ratio, Py_ssize_t min_leaf):
    """Best (attribute, value, gain) over ``samples``; attribute is -1 if none qualifies."""
    cdef intp[:, ::1] order = _presort(X, samples)
    cdef Py_ssize_t m = order.shape[1]
    cdef Py_ssize_t attr, i
    cdef double value, gain
    cdef count_t* buf = <count_t*>calloc(3 * n_classes, sizeof(count_t))
    if buf == NULL:
        raise MemoryError()
    try:
        for i in range(m):
            buf[y[order[0, i]]] += 1
        _find_split(X, is_numeric, y, order, 0, m, n_classes, q, ratio, min_leaf,
                    buf, buf + n_classes, buf + 2 * n_classes, &attr, &value, &gain)
    finally:
        free(buf)
    if gain <= MIN_GAIN:
        attr = -1
    return attr, value, gain


def build(const double[:, ::1] X, const unsigned char[::1] is_numeric, const intp[::1] y,
          Py_ssize_t n_classes, samples, double q, int ratio, Py_ssize_t min_leaf,
          Py_ssize_t max_depth):
    """Grow a tree; returns preorder arrays (attr, value, left, right, counts)."""
    cdef intp[:, ::1] order = _presort(X, samples)
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t m = order.shape[1]
    cdef Py_ssize_t k = n_classes
    cdef Py_ssize_t start, end, depth, node, i, j, c, n_left, w_left, w_right, n_pure
    cdef Py_ssize_t attr
    cdef double value, gain
    cdef intp s
    cdef unsigned char* goes_left = <unsigned char*>calloc(X.shape[0], 1)
    cdef intp* tmp = <intp*>malloc((m + 1) * sizeof(intp))
    cdef count_t* buf = <count_t*>calloc(3 * k, sizeof(count_t))
    cdef count_t* parent = buf
    cdef count_t* left = buf + k
    cdef count_t* right = buf + 2 * k
    if goes_left == NULL or tmp == NULL or buf == NULL:
        free(goes_left); free(tmp); free(buf)
        raise MemoryError()

    attrs, values, lefts, rights, counts = [], [], [], [], []
    # (start, end, depth, parent node, is-left-child)
    stack = [(0, m, 0, -1, False)]
    try:
        while stack:
            start, end, depth, parent_node, is_left = stack.pop()
            node = len(attrs)
            if parent_node >= 0:
                if is_left:
                    lefts[parent_node] = node
                else:
                    rights[parent_node] = node
            memset(parent, 0, k * sizeof(count_t))
            for i in range(start, end):
                parent[y[order[0, i]]] += 1
            n_pure = 0
            for c in range(k):
                if parent[c] > 0:
                    n_pure += 1
            attr = -1
            if n_pure > 1 and end - start > min_leaf and (max_depth < 0 or depth < max_depth):
                with nogil:
                    _find_split(X, is_numeric, y, order, start, end, k, q, ratio, min_leaf,
                                parent, left, right, &attr, &value, &gain)
                if gain <= MIN_GAIN:
                    attr = -1
            counts.append([parent[c] for c in range(k)])
            lefts.append(-1)
            rights.append(-1)
            if attr < 0:
                attrs.append(-1)
                values.append(0.0)
                continue
            attrs.append(attr)
            values.append(value)
            with nogil:
                n_left = 0
                for i in range(start, end):
                    s = order[attr, i]
                    if is_numeric[attr]:
                        goes_left[s] = X[s, attr] <= value
                    else:
                        goes_left[s] = X[s, attr] == value
                    n_left += goes_left[s]
                for j in range(d):
                    w_left = start
                    w_right = 0
                    for i in range(start, end):
                        s = order[j, i]
                        if goes_left[s]:
                            order[j, w_left] = s
                            w_left += 1
                        else:
                            tmp[w_right] = s
                            w_right += 1
                    memcpy(&order[j, w_left], tmp, w_right * sizeof(intp))
            stack.append((start + n_left, end, depth + 1, node, False))
            stack.append((start, start + n_left, depth + 1, node, True))
    finally:
        free(goes_left)
        free(tmp)
        free(buf)
    return (
        np.array(attrs, dtype=np.intp),
        np.array(values, dtype=np.float64),
        np.array(lefts, dtype=np.intp),
        np.array(rights, dtype=np.intp),
        np.array(counts, dtype=np.int64).reshape(len(attrs), k),
    )
