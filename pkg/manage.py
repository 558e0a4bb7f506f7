#!/usr/bin/env python
from eulerlab.main import main

if __name__ == "__main__":
    main(prog="manage.py")
