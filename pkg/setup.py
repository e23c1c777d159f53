# Builds the optional compiled kernels. The package works without them:
# rdopt._kernels falls back to the numpy implementation at import time.
#
#   python setup.py build_ext --inplace    (or just `pip install -e .`)

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "rdopt._kernels._fastkern",
                ["src/rdopt/_kernels/_fastkern.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
