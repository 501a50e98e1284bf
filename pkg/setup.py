import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("UDKERNEL_PURE_PYTHON"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "udkernel._lct",
                    ["src/udkernel/_lct.pyx"],
                    language="c++",
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
