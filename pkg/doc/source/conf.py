# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# openstackdocstheme is optional; the plain sphinx theme is fine for a
# local build.
try:
    import openstackdocstheme  # noqa
except ImportError:
    has_openstackdocstheme = False
else:
    has_openstackdocstheme = True

# -- General configuration -----------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'stevedore.sphinxext',
]
if has_openstackdocstheme:
    extensions.append('openstackdocstheme')

openstackdocs_auto_name = False

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'sleepwake'
copyright = '2026, sleepwake Developers'

exclude_patterns = []
pygments_style = 'native'

# -- Options for HTML output ------------------------------------------

if has_openstackdocstheme:
    html_theme = 'openstackdocs'

htmlhelp_basename = 'sleepwakedoc'

# -- Options for LaTeX output ----------------------------------------

latex_elements = {}

latex_documents = [
    (
        'index',
        'sleepwake.tex',
        'sleepwake Documentation',
        'sleepwake Developers',
        'manual'
    ),
]

autodoc_default_options = {
    'members': None,
    'show-inheritance': None
}
