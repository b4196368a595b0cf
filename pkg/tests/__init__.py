# -*- coding: utf-8 -*-
"""Tests module."""
