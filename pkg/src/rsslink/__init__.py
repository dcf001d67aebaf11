"""Link budgets for reconfigurable smart surfaces on terrestrial and aerial platforms."""

__version__ = "0.1.0"
