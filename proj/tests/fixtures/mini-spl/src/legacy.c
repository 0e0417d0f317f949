#include "util.h"

#ifdef CONFIG_LEGACY
int shim_enabled = 1;
#endif

#if defined(CONFIG_UDP) && !defined(CONFIG_NET)
int orphan_transport(void) { return -1; }
#endif
