#include <pybind11/pybind11.h>
PYBIND11_MODULE(qocpy, m) { m.doc() = "placeholder"; }
