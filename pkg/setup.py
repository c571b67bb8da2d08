"""Build script: compiles the optional search kernel.

The package is fully functional without the extension (a pure-Python twin
is selected at import time), so a failed compile downgrades to a warning
instead of breaking the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/hyperchrom/_kernel.pyx"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except Exception as exc:  # pragma: no cover - toolchain-dependent
    sys.stderr.write(f"hyperchrom: skipping compiled kernel ({exc})\n")

setup(ext_modules=ext_modules)
