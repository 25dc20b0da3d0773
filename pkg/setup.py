import os.path

import setuptools


current_directory = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(current_directory, "README.md"), encoding="utf-8") as h:
    long_description = h.read()

with open(os.path.join(current_directory, "requirements.txt")) as h:
    install_requires = [line for line in h.read().split("\n") if line]

package_name = "brats_toolkit"

setuptools.setup(
    name="brats-toolkit",
    version="0.1.0",
    license="MIT",
    description="Brain tumor segmentation and survival prediction toolkit",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.9",
    install_requires=install_requires,
    entry_points={
        "console_scripts": [
            f"brats={package_name}.cli:cli",
        ],
    },
)
