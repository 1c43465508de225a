# Numerical library: Dicke-space squeezing dynamics, QFI, bounds and checks
