# Domain model test package
