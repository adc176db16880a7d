# Builds the optional Cython kernel extension. If Cython (or a C toolchain)
# is unavailable the package still installs and falls back to the pure
# numpy kernels at import time.

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "blindspot._kernels._fast",
                ["src/blindspot/_kernels/_fast.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
