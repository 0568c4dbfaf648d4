"""Build script.

The compiled kernel in src/fano/_kernels.pyx is optional: if Cython or a C
compiler is missing the install falls back to the pure numpy kernels with
identical semantics (see fano._backend).
"""

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "fano._kernels_c",
                ["src/fano/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
