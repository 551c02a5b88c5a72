"""
End-to-End Tests Package

Complete pipeline tests from experiment files and CLI arguments to emitted reports and the results store.
"""
