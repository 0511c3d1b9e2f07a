class BackendUnavailable(RuntimeError):
    """An external toolchain (JDK, OpenJML) is not installed or not configured."""
