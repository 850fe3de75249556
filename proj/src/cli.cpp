namespace asd {}
