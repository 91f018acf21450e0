# Utils package

