# Copyright 2026 The straightline authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from setuptools import setup, find_packages


CONSOLE_ENTRYPOINT = "slp=straightline.cli:main"


setup(
    name="straightline",
    description="Balancing and querying straight-line programs.",
    author="The straightline authors",
    license="Apache Software License",
    packages=find_packages(exclude=["tests"]),
    use_scm_version={"version_scheme": "post-release"},
    setup_requires=["setuptools_scm"],
    python_requires=">=3.7",
    install_requires=["mlflow>=1.2.0", "pytz", "networkx>=2.4", "numpy"],
    entry_points={"console_scripts": [CONSOLE_ENTRYPOINT]},
)
