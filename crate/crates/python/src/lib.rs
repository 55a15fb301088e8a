// bindings in progress
