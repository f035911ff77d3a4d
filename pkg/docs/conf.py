#!/usr/bin/env python
#
# cfot documentation build configuration file
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys
from datetime import datetime

from inicheck.tools import config_documentation
from pkg_resources import get_distribution

import cfot  # noqa

# Write the config section of the user guide from the master config
config_documentation('./user_guide/auto_config.rst', modules='cfot')

if os.environ.get('READTHEDOCS') == 'True':
    sys.path.insert(0, os.path.abspath('.'))
else:
    sys.path.insert(0, os.path.abspath('../'))

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.doctest',
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',
    'sphinx.ext.imgmath',
    'sphinx.ext.intersphinx',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'cfot'
copyright = '{} cfot developers'.format(datetime.now().year)
author = 'cfot developers'

version = get_distribution('cfot').version
release = get_distribution('cfot').version

language = None
exclude_patterns = []
pygments_style = 'sphinx'
numfig = True

# -- Napoleon ----------------------------------------------------------------

napoleon_google_docstring = True
napoleon_numpy_docstring = False
napoleon_include_init_with_doc = False
napoleon_use_param = True
napoleon_use_rtype = True

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
}

# -- Options for HTML output -------------------------------------------------

html_theme = 'pydata_sphinx_theme'
html_sidebars = {'**': ['globaltoc.html',
                        'relations.html', 'sourcelink.html', 'searchbox.html']}
htmlhelp_basename = 'cfotdoc'

man_pages = [
    (master_doc, 'cfot', 'cfot Documentation', [author], 1)
]
