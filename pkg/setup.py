"""Build script for the optional compiled kernel extension.

The package works without the extension: forestdetect.kernels falls back to
pure-NumPy implementations when forestdetect.kernels._core is missing.
"""
from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "forestdetect.kernels._core",
                ["src/forestdetect/kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
