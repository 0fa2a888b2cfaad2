# Utility modules for the two-photocurrent simulator
