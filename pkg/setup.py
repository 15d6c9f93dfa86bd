import os

from setuptools import Extension, setup

# The compiled kernel is optional: without Cython (or with QEDGE_NO_EXT=1)
# the package installs pure-Python and qedge.simulator falls back to the
# numpy kernel at import time.
ext_modules = []
if os.environ.get("QEDGE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "qedge.simulator._kernel_cy",
                    ["src/qedge/simulator/_kernel_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
