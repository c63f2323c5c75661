# None
