import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ZPTOWER_PURE") != "1" and os.path.exists("src/zptower/_kernel.pyx"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "zptower._kernel",
                    ["src/zptower/_kernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)
