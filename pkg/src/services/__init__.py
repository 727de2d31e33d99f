# Computations over codes, circuits and fault patterns
