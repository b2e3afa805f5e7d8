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

try:
    import openstackdocstheme  # noqa
except ImportError:
    has_openstackdocstheme = False
else:
    has_openstackdocstheme = True

# -- General configuration ------------------------------------------------

extensions = [
    'reno.sphinxext',
]
if has_openstackdocstheme:
    extensions.append('openstackdocstheme')

openstackdocs_auto_name = False

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'sleepwake Release Notes'
copyright = '2026, sleepwake Developers'

# Release notes are version independent.
release = ''
version = ''

exclude_patterns = []
pygments_style = 'native'

# -- Options for HTML output ----------------------------------------------

if has_openstackdocstheme:
    html_theme = 'openstackdocs'

htmlhelp_basename = 'sleepwakeReleaseNotesDoc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {}

latex_documents = [
    ('index', 'sleepwakeReleaseNotes.tex',
     'sleepwake Release Notes Documentation',
     'sleepwake Developers', 'manual'),
]

# -- Options for Internationalization output ------------------------------

locale_dirs = ['locale/']
