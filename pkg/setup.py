"""Build the optional compiled kernel.

If Cython or a C compiler is unavailable the package still installs and
falls back to ``olb._pykernel`` at import time.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("olb._ckernel", ["src/olb/_ckernel.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
