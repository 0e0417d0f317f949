# Copyright 2026 the varscope authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied. See the License for the specific language governing
# permissions and limitations under the License.

"""Variability analysis workbench for C-preprocessor product lines.

The heavy lifting lives in the compiled ``_varscope`` extension; this package
re-exports its public surface.
"""

from _varscope import *  # noqa: F401,F403
from _varscope import __version__  # noqa: F401
