"""Build script for the compiled allocation search core.

The package works without the extension (a pure-Python kernel is selected at
import time), so failures here only cost speed, not functionality.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "hsrsim.allocation._bnb",
                sources=["src/hsrsim/allocation/_bnb.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
