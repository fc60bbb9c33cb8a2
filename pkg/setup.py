from setuptools import setup

setup(
    name='sp4-building-zeta',
    packages=['sp4_building_zeta'],
    install_requires=['numpy', 'scipy', 'sympy', 'plotly', 'colorlover'],
    extras_require={'test': ['pytest']},
    entry_points={'console_scripts': ['sp4-zeta=sp4_building_zeta.cli:main']},
    version='0.1.0',
    license='MIT',
    description='Exact Hecke operator, spectrum and zeta function checks for the building of GSp4',
    long_description=open('README.md').read(),
    long_description_content_type="text/markdown",
    python_requires='>=3.8',
    classifiers=(
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ),
)
