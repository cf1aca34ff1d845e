# -*- coding: utf-8 -*-
"""
Scenario files shipped with nvholo.
"""
