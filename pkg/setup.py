"""Build the optional compiled counting kernel.

Without Cython (or a C compiler) the package still installs and uses the
numpy implementation in ``diracwmc._kernel_py``.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("DIRACWMC_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "diracwmc._kernel",
                    ["src/diracwmc/_kernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
