# Agents package

