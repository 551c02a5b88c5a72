"""Configuration, errors and report output"""
