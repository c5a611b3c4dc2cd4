import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("FRCODES_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:  # pure-Python install
        pass
    else:
        ext_modules = cythonize(
            [Extension("frcodes._kernels_c", ["src/frcodes/_kernels_c.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
