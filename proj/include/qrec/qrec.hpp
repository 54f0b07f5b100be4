#pragma once

#include "qrec/error.hpp"
#include "qrec/linalg.hpp"
#include "qrec/random.hpp"
#include "qrec/partial_density.hpp"
#include "qrec/quantum_logic.hpp"
#include "qrec/intervals.hpp"
#include "qrec/observables.hpp"
#include "qrec/qlang/gates.hpp"
#include "qrec/qlang/ast.hpp"
#include "qrec/qlang/parser.hpp"
#include "qrec/qlang/interpreter.hpp"
#include "qrec/serialize.hpp"
