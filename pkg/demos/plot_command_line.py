"""
Command-line workflow
=====================

Drive the ``secrecy-sg`` entry point from Python: a closed form, a small
simulation, and a validation suite.
"""

from secrecy_sg.cli import main

main(["analytic", "--formula", "s1-mean", "--lambda-bs", "1", "--lambda-e", "1", "--alpha", "4"])
main(["analytic", "--formula", "s3-radius-ccdf", "--d0", "1", "--r0", "0"])

###############################################################################
# CSV on stdout: a provenance comment, one row per threshold, then trailers.

main(["simulate", "--scenario", "s1", "--trials", "2000", "--seed", "42", "--r0-max", "2", "--workers", "1"])

###############################################################################
# Validation suites print PASS/FAIL lines; the exit status is 1 on failure.

status = main(["validate", "--suite", "ordering", "--trials", "200"])
print("exit status", status)
