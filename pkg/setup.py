import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("DIFFHOPF_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("diffhopf._ckernels", ["src/diffhopf/_ckernels.pyx"], extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
