#if VERSION > 2
int modern;
#endif
