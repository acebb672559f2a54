"""fidelbot: an Amharic FAQ chatbot engine.

Pipeline: Ethiopic text preprocessing -> bag-of-words features -> one of
three from-scratch intent classifiers -> context-aware response selection,
served over a webhook-compatible HTTP service.
"""

__version__ = "0.1.0"
