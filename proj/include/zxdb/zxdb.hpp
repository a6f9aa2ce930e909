#pragma once

#include "zxdb/circuit.hpp"
#include "zxdb/diagram.hpp"
#include "zxdb/errors.hpp"
#include "zxdb/generators.hpp"
#include "zxdb/io.hpp"
#include "zxdb/phase.hpp"
#include "zxdb/rules.hpp"
#include "zxdb/scheduler.hpp"
#include "zxdb/tensor.hpp"
#include "zxdb/verify.hpp"
