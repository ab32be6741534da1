# -*- coding: utf-8 -*-
#
# manifold-filter-combine documentation build configuration file.

import os
import sys

sys.path.insert(0, os.path.abspath('../..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.coverage',
    'sphinx.ext.mathjax',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'manifold-filter-combine'
copyright = u'2026, manifold-filter-combine developers'
author = u'manifold-filter-combine developers'

from manifold_filter_combine import __version__  # noqa: E402

version = '.'.join(__version__.split('.')[:2])
release = __version__

language = None
exclude_patterns = []
pygments_style = 'sphinx'
todo_include_todos = False

html_theme = 'alabaster'
html_static_path = []
htmlhelp_basename = 'manifold-filter-combinedoc'

man_pages = [
    (master_doc, 'mfcn', u'manifold-filter-combine Documentation', [author], 1)
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
}
