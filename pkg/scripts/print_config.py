from grouplens.config import get_settings

settings = get_settings()
print(f"Element cap: {settings.ELEMENT_CAP}")
print(f"Symmetric degree cap: {settings.SYMMETRIC_DEGREE_CAP}")
print(f"Enumeration cap: {settings.ENUMERATION_CAP}")
print(f"Minimality cap: {settings.MINIMALITY_CAP}")
print(f"Lift enumeration cap: {settings.LIFT_ENUMERATION_CAP}")
print(f"Samples: {settings.SAMPLE_COUNT}, contexts: {settings.CONTEXT_COUNT}, seed: {settings.SEED}")
print(f"Log level: {settings.LOG_LEVEL}")
