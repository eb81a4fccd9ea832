"""earsim: simulation gloutonne d'arbres de décision pour les systèmes de règles"""
__version__ = "0.1.0"
