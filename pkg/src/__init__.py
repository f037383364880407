# Composite pulse toolkit: constructors, propagator, solver and analysis
