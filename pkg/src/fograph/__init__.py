"""First-order logic on graphs: formulas, prenex transforms, densities, games and random-graph probes."""
