"""Вычислительные сервисы."""
