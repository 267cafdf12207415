"""Build script: compiles the optional Jacobi kernel.

The package works without the extension (a plain-Python kernel is selected
at import time), so a missing compiler or Cython only costs speed.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "toposq._kernel._jacobi",
                ["src/toposq/_kernel/_jacobi.pyx"],
                # -ffp-contract=off keeps the compiled rotations bit-compatible
                # with the pure-Python kernel (no fused multiply-add).
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
