# Sphinx configuration for the geoent documentation.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))


project = 'geoent'
copyright = '2026, geoent developers'
author = 'geoent developers'

version = ''
release = 'alpha'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.todo',
    'sphinx.ext.viewcode',
    'sphinx.ext.githubpages',
    'sphinxemoji.sphinxemoji',
]

source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store', 'README.md']

html_theme = 'furo'

todo_include_todos = True
