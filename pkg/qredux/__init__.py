"""qredux: точные и асимптотические избыточности универсального кодирования кубитов."""

__version__ = "0.1.0"
