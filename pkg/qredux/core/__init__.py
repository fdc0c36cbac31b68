"""Конфигурация и исключения."""
