# Core numerics for the two-photocurrent simulator
