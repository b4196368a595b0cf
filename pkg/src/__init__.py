# -*- coding: utf-8 -*-
"""
VQA landscape laboratory - Source Package.

Maps randomized variational quantum algorithms onto Wishart hypertoroidal
random fields, predicts where their local minima sit and checks the
prediction against VQE training runs on the Fermi-Hubbard chain.
"""

__version__ = "0.1.0"
