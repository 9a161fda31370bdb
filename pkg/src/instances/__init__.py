"""Built-in instance registry"""
