# Transverse package initialization
