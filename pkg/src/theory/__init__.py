# -*- coding: utf-8 -*-
"""Random-matrix, free-probability and Kac-Rice predictions for WHRF landscapes."""
