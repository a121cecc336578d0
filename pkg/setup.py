from setuptools import setup, find_packages

with open("readme.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [line.strip() for line in fh if line.strip() and not line.startswith("#")]

setup(
    name="flipchains",
    version="0.1.0",
    description="Edge-flip Markov chains on quadrangulations and their tree-side comparison chains",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests"]),
    package_data={
        'flipchains': [
            'config/*.json',
        ],
    },
    install_requires=requirements,
    extras_require={
        "test": ["pytest>=7.0", "hypothesis>=6.0"],
    },
    entry_points={
        "console_scripts": [
            "flipchains=flipchains.cli:main",
        ],
    },
    python_requires=">=3.8",
    include_package_data=True
)
