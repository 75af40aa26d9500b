import os

import numpy as np
from setuptools import Extension, setup

# TSALLIS_TREE_NO_EXT=1 installs the pure-Python fallback only.
ext_modules = []
if not os.environ.get("TSALLIS_TREE_NO_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tsallis_tree._split",
                ["src/tsallis_tree/_split.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # no FMA contraction: gains must round exactly like the Python fallback
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
