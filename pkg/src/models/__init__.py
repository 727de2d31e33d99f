# Value types: bit matrices, codes, Pauli operators, tableaux, circuits and reports
