namespace workbench {}
