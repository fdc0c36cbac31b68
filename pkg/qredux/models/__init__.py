"""Модели данных."""
