#pragma once

#include "plap/assembly.hpp"
#include "plap/bench.hpp"
#include "plap/energy.hpp"
#include "plap/io.hpp"
#include "plap/linalg.hpp"
#include "plap/mesh.hpp"
#include "plap/optimizer.hpp"
#include "plap/problem.hpp"
