import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("HSG_PURE_PYTHON"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "hsgkit.kernels._native",
                    ["src/hsgkit/kernels/_native.pyx"],
                    # keep IEEE semantics identical to the Python fallback
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
