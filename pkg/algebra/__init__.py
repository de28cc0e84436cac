# Algebra package initialization
