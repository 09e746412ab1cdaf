from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # The package runs on the pure-NumPy kernel when Cython is unavailable.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "ar1invest._kernels._pathsim_cy",
                ["src/ar1invest/_kernels/_pathsim_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
