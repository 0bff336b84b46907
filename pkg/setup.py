"""Build script.

The scaled-coefficient kernels have a Cython implementation
(msumma._kernels._core).  If Cython or a C compiler is unavailable the
package still works: msumma._kernels falls back to the pure numpy
implementation at import time.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/msumma/_kernels/_core.pyx"],
        language_level=3,
    )
    include_dirs = [numpy.get_include()]
except Exception as exc:  # pragma: no cover - build-env dependent
    print(f"msumma: building without compiled kernels ({exc})", file=sys.stderr)
    include_dirs = []

if ext_modules:
    for ext in ext_modules:
        ext.include_dirs.extend(include_dirs)

setup(ext_modules=ext_modules)
