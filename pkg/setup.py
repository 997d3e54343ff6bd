"""Setup script for enn-argon."""

from setuptools import find_packages, setup

setup(
    name="enn-argon",
    version="1.0.0",
    description="Unitary-equivariant feedforward networks for learned Lennard-Jones Argon forces",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={"enn_argon": ["metadata/*.yaml"]},
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "mcp>=1.0.0,<2",
        "pydantic>=2.0.0,<3.0.0",
        "pyyaml>=6.0",
    ],
    python_requires=">=3.10",
    entry_points={
        "console_scripts": [
            "enn-argon=enn_argon.__main__:main",
            "enn-argon-mcp=enn_argon.server:run",
        ],
    },
)
