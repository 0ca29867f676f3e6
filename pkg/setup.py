from setuptools import setup, find_packages

setup(
    name="ellipsoid-squeezer",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    include_package_data=True,
    install_requires=[
        "click>=8.0.0",
        "rich>=10.0.0",
        "numpy>=1.22.0",
        "scipy>=1.8.0",
    ],
    entry_points={
        "console_scripts": [
            "ellipsoid-squeezer=ellipsoid_squeezer.cli:main",
        ],
    },
    description="Numerical lower bounds for the squeezing function of general complex ellipsoids",
    long_description=open("README.md", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    keywords="squeezing function, complex ellipsoid, pseudoconvex, levi form, several complex variables",
    python_requires=">=3.8",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
