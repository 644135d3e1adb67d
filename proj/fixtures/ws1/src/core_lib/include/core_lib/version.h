#pragma once
#define CORE_LIB_VERSION "1.0.0"
