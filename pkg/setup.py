from setuptools import setup, find_packages

setup(
    name="choisense",
    version="0.1",
    description="Exact certification of extremal marginal states from Kraus families",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.11",
        "pandas>=2.0",
        "pydantic>=2.0",
        "python-dotenv>=1.0",
        "tqdm>=4.66",
    ],
    extras_require={
        "dev": ["pytest>=7.4", "pytest-cov", "black", "isort", "mypy"],
    },
    entry_points={
        "console_scripts": [
            "choisense=choisense.cli.main:main",
        ],
    },
)
