"""Build the optional Cython kernels.

The package imports and runs without them; ``crdcache.kernels`` falls back to
the pure-Python implementation when the extension is missing.
"""

import os

import numpy
from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CRDCACHE_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "crdcache._kernels",
                    ["src/crdcache/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
