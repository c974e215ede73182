from setuptools import setup, find_packages

setup(
    name="grid2x",
    version="0.1.0",
    packages=find_packages(exclude=["examples", "examples.*"]),
    install_requires=[
        "pydantic>=2.4.2",
        "click>=8.1.0",
        "pyyaml",
        "jsonschema",
        "python-json-logger>=2.0.2",
        "networkx>=3.1",
        "sympy>=1.12",
    ],
    extras_require={
        "test": ["pytest", "pytest-asyncio", "pytest-cov"],
    },
    entry_points={
        "console_scripts": ["grid2x=src.core.cli_interface:main"],
    },
    author="Your Name",
    author_email="your.email@example.com",
    description="Enumeration of symmetrical 2-extensions of the d-dimensional grid",
    long_description=open("readme.md").read(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.9",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
)
