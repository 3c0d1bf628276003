# Ordode - ordered ODE solver
