"""
Value types shared across services.

- bidegree: Bidegree and Window
- coefficient_model: CoefficientModel and the model loader
- descriptors: GeneratorDescriptor, PoincareTable, OperationDescriptor
"""
