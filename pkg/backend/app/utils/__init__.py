# Utilities package: error hierarchy and file codecs
