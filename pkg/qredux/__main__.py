"""Запуск `python -m qredux`."""

from qredux.main import main

main()
