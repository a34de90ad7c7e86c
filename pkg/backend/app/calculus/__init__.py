# k-special functions, singular quadrature and k-Prabhakar operators
