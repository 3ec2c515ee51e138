project = 'pkpres'
copyright = '2025, pkpres contributors'
author = 'pkpres developers'
templates_path = ['_templates']
html_theme = 'sphinx_rtd_theme'
highlight_language = 'none'
master_doc = 'index'
