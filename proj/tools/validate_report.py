#!/usr/bin/env python3
"""Validate ff JSON documents against schemas/report.schema.json.

Usage: validate_report.py SCHEMA [FILE ...]   (reads stdin when no file is given)
"""
import json
import sys

import jsonschema


def main(argv):
    if len(argv) < 2:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    with open(argv[1]) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)
    sources = argv[2:] or ["-"]
    bad = 0
    for src in sources:
        doc = json.load(sys.stdin) if src == "-" else json.load(open(src))
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors:
            print(f"{src}: {'/'.join(map(str, e.path))}: {e.message}", file=sys.stderr)
        bad += bool(errors)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
