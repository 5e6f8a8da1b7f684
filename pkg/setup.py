"""Build hook for the optional compiled kernel.

The package is pure Python except for pzlkit._kernels._ckern, a small
Cython module holding the hot enumeration loops.  The extension is marked
optional: if Cython or a C compiler is unavailable the install still
succeeds and the pure-Python kernels are used at runtime.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pzlkit._kernels._ckern",
                ["src/pzlkit/_kernels/_ckern.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
