import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        [Extension(
            "halfinv._kernels",
            ["src/halfinv/_kernels.pyx"],
            include_dirs=[numpy.get_include()],
        )],
        language_level=3,
    )
except ImportError:
    # pure-python fallback in halfinv._kernels_py is used instead
    ext_modules = []

setup(ext_modules=ext_modules)
