# This file makes the tests directory a Python package
# It can be left empty
