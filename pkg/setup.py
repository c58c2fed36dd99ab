"""Build the optional compiled kernel core.

The extension links against numpy's npyrandom static library so the C
truncated-normal kernels draw from the same bit-generator streams as the
Python API. If Cython or a C toolchain is unavailable the build degrades
to the pure-Python kernel backend (see skewgibbs.kernels).
"""

import os

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    random_lib = os.path.abspath(
        os.path.join(np.get_include(), "..", "..", "random", "lib")
    )
    ext_modules = cythonize(
        [
            Extension(
                "skewgibbs.kernels._ckernels",
                sources=["src/skewgibbs/kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                library_dirs=[random_lib],
                libraries=["npyrandom"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # -ffp-contract=off keeps C arithmetic bit-identical to the
                # pure-Python mirror (no fused multiply-add contraction).
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
