__project__ = "dyadpot"
__version__ = "0.1.0"
