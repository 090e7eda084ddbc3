"""Setup script for product-percolation."""

from setuptools import find_packages, setup

with open("README.md", "r", encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="product-percolation",
    version="1.0.0",
    description="Seeded percolation experiments on trees with lattice insertions and their products with Z",
    long_description=long_description,
    long_description_content_type="text/markdown",
    author="Anonymous",
    author_email="anonymous@example.com",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "pyyaml>=6.0.1",
        "jsonschema>=4.18",
    ],
    package_data={"product_percolation.outputs": ["*.json"]},
    extras_require={
        "dev": ["pytest>=7.0", "networkx>=3.0"],
    },
    entry_points={
        "console_scripts": [
            "product-percolation=product_percolation.cli:main",
        ],
    },
    python_requires=">=3.10",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
