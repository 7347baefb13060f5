#!/usr/bin/env python3
"""Run a layergreen command and validate its JSON output against a schema."""
import json
import subprocess
import sys

import jsonschema


def main():
    if len(sys.argv) < 4:
        print("usage: validate.py SCHEMA EXE ARGS...", file=sys.stderr)
        return 2
    with open(sys.argv[1]) as f:
        schema = json.load(f)
    proc = subprocess.run(sys.argv[2:], capture_output=True, text=True)
    if proc.returncode != 0:
        print(proc.stderr, file=sys.stderr)
        return 1
    jsonschema.validate(json.loads(proc.stdout), schema)
    print("valid")
    return 0


if __name__ == "__main__":
    sys.exit(main())
