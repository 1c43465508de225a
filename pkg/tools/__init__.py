# Output writers used by the CLI
